//! Hand-written Czech word lists. Inflected forms are listed as separate
//! entries so that suffix series form rhyme families.

/// Unstressed-friendly monosyllables: conjunctions, pronouns, particles.
pub const FUNCTION: &str = "
a i že jak kde když kam co tak jen již už tam zde sem ten ta to ty my vy on
je jsem jsi byl mi ti mu ho jí si nás vás já náš můj tvůj svůj víc však pak
snad hned dál zas proč kdo kdy nic vším též jež než ni ať ba ó ach buď
tvá má svá jsou jest mne tě své mé tvé ký čí sám
";

/// The most frequent short function words, drawn more often than the rest.
pub const FREQUENT: &str = "a i je to že se si mi ti jak";

/// Monosyllables that carry content.
pub const CONTENT_MONO: &str = "
den noc les mech dům sníh déšť mráz žal cit sen hrad most práh kříž zvon
lán háj luh ples hrob štít meč kůň vůz pluh smích pláč šum vír sad břeh
prach dech vzdech hlas zrak sluch lid kmen rod pán Bůh muž hoch host kmet
drak lev vlk pes pták strom keř květ list plod kmen proud tok brod vrch
důl kout svět čas věk rok mír boj hněv hřích ráj žár jas svit stín tvar
hvozd tůň zem ves kraj chlum val tón zpěv žal klid chlad vál šel
pad jde zní dlí spí ční mlč pěj hyň zhyň stůj běž leť plaň
";

/// Vocalic prepositions; they take the stress of the following word.
pub const PREPOSITIONS: &str = "po do na za o u ve ke ze od pod nad při pro bez přes";

/// Single-consonant prepositions; they have no syllable of their own.
pub const CLITICS: &str = "v s z k";

/// Polysyllabic words of every class.
pub const WORDS: &str = "
moře vlna loďka přístav maják racek útes písek mělčina hlubina
řeka potok pramen tůňka jezero rybník bažina rákosí olše vrba
lípa bříza jedle borovice smrčina dubina habřina javor jasan buk
hora skála úbočí stráň údolí rokle soutěska vrcholek hřeben pahorek
pole louka meze úhor strniště oranice brázda obilí pšenice ječmen
zahrada sadu jabloně hrušeň třešeň višeň švestka ořešák kaštan růže
fiala lilie kopretina pomněnka chrpa vlčí mák sedmikráska petrklíč
slunce měsíc hvězda obloha nebesa mraky oblaka bouře blesky hromy
vítr vánek vichr vichřice mlha rosa jinovatka kapky krůpěje slzy
jaro léto podzim zima ráno večer poledne půlnoc soumrak svítání
matka otec sestra bratře dcera synku babička dědeček milá milý
dívka chlapec poutník rytíř král královna kněžna panna vdova sirotek
srdce duše mysli myšlenka touha naděje víra láska věrnost bolest
radost smutek stesk žalost úzkost lítost pokora pýcha zloba vina
píseň zpěvák housle varhany zvonek šalmaj loutna píšťala bubínek
chaloupka chalupa vesnice městečko hradby věže kostel kaple hřbitov
okno dveře práhy komora světnice jizba krb ohniště plamen jiskra
cesta pěšina silnice stezka rozcestí mostek lávka brána vrátka plot
kniha dopis slovo věta modlitba přísaha kletba pohádka báseň zpěvy
holubice vlaštovka skřivánek slavík kukačka sýkorka havran sokol orel
labuť husa kachna čáp volavka jelen srna zajíc liška veverka
zlatý stříbrný modrý zelený bílý černý rudý šedý temný světlý
tichý hlučný smutný veselý dobrý zlý mladý starý krásný ubohý
vysoký hluboký široký daleký blízký milený drahý věrný prostý svatý
zlaté stříbrné modré zelené bílé černé rudé šedé temné světlé
tiché hlučné smutné veselé dobré mladé staré krásné ubohé
zlatá stříbrná modrá zelená bílá černá rudá šedá temná světlá
tichá hlučná smutná veselá dobrá mladá stará krásná ubohá
vysokém hlubokém širokém dalekém blízkém tichém temném zlatém
vysokou hlubokou širokou dalekou tichou temnou zlatou modrou bílou
pěnné pěnný pěnná vlnné vlnný snivé snivý snivá jarní letní zimní
lesní polní horní dolní noční denní ranní večerní půlnoční jitřní
zpívá volá šumí hučí zvoní vzlyká pláče kvílí úpí sténá
zpívám volám šumím zvoním pláču kvílím sténám bloudím toužím snívám
zpívali volali šumeli zvonili plakali bloudili toužili snili
spěchá kráčí bloudí putuje letí plyne teče padá stoupá klesá
hoří svítí září pálí chladí mrazí taje kvete vadne usíná
vstává bdí čeká doufá věří miluje nenávidí odpouští zapomíná
vzpomíná myslí tuší cítí slyší vidí hledá nachází ztrácí
ztratil našel viděl slyšel cítil toužil čekal doufal věřil
ztratila našla viděla slyšela cítila toužila čekala doufala věřila
zpívala volala šuměla zvonila plakala bloudila snila kvetla
zpívání volání šumění zvonění plakání bloudění snění kvetení
toulání čekání doufání milování hledání loučení setkání shledání
zapomnění procitnutí rozloučení odpuštění vykoupení požehnání
přání zdání stání lkání mávání klekání vyznání zoufání
svítání zrání vání plání dlání skání tkání lání hraní
mládí stáří štěstí neštěstí bezpečí nebezpečí zápětí
krajina dědina rovina lučina hlubina dolina bylina mýtina
vodami horami lesy poli lukami skalami vlnami hvězdami nocemi
rukama očima ušima nohama srdcem duší myslí láskou touhou
zlatem stříbrem mramorem kamenem železem olovem dřevem sklem
do tmy do dálky do hlubin do nebe do srdce do duše
večery jitra polední krásy slasti strasti časy věky
modlitby písně slova knihy listy dopisy zprávy hlasy
peřeje tůně proudy víry vlnky krůpěje kaluže loužky
noří reje brázdí pluje kolébá houpá kolíbá hladí
lehce tiše zlehka sladce hořce smutně vesele trpce tklivě
věčně stále zase opět dlouho krátce navždy nikdy vždycky
dnes zítra včera tehdy potom kdysi jednou znovu sotva
daleko blízko vysoko hluboko široko doma venku všude nikde
ruka noha hlava oči ústa tvář čelo vlasy ňadra klína
ruce nohy hlavy tváře čela rty dlaně prsty skráně
matičko otče bratře sestro milenko milý dívko hochu
kalina malina jahoda borůvka ostružina brusinka ořechy
vínek věnec korálky stužka šátek sukně košile kabát
sekera kosa srpy hrábě pluhy brány motyka rýč
chleba sůl mléko med víno voda pivo mouka
hospoda krčma trhy jarmark pouť posvícení svatba křtiny
hřívu koně sedlo uzdu ostruhy podkovy bič
zahrady zahradou zahradě zahradu zahrádka zahrádce
dálce dálka dálku dálek dálkách dálkou
noci nocí nocích nocem nocemi
slunci sluncem sluncí slunko sluníčko
poupě poupata květy květům květech květinou květina
kamení kamenem kamínky kamínek
tichu tichem ticho tichem tišina
šero šeru šerem šerý šeré
zasněný zasněná zasněné zasněnou
vzdálený vzdálená vzdálené vzdálenou
ztracený ztracená ztracené ztracenou
bledý bledá bledé bledou
jasný jasná jasné jasnou
krutý krutá kruté krutou
žhavý žhavá žhavé žhavou
hbitý hbitá hbité hbitou
něžný něžná něžné něžnou
mocný mocná mocné mocnou
silný silná silné silnou
snivě jasně něžně mocně silně krutě bledě žhavě
kolem okolo podle vedle mezi napříč skrze
otevřel zavřel vzal dal nesl vedl hnal bral
otevřela zavřela vzala dala nesla vedla hnala brala
poslouchat naslouchat zpívati volati snívati toužiti
bloudit toužit snít spát bdít žít mřít lkát
umírá umírat zemřel zemřela zrodil zrodila narodil
rozkvetla rozkvetlá rozkvetlé rozkvetlý rozkvétá
zazněla zazněl zazní zaznívá doznívá
zahořel zahořela zahoří zahořelo
rozlila rozlil rozlije rozlévá
vytryskl vytryskla vytryská tryská
šeptá šeptal šeptala šepot šepotem
zpěvem zpěvu zpěvy zpěvák zpěvačka
tanec tance tanči tančí tančila tančil
obrázek obrázky obraz obrazy obrazem
vzduchem vzduchu vzduch vzduchy
dechem dechu dechy vydechne vydech
záře zářil zářila zářivý zářivá zářivé
lesklý lesklá lesklé lesklou lesk lesku
zvonky zvonků zvoncích zvonečky
šumná šumný šumné šumnou
horoucí vroucí planoucí hořící zářící
bloudící toužící snící spící bdící
kvetoucí vadnoucí plynoucí tekoucí padající
ptáci ptáků ptákům ptačí ptáčky ptáčku ptáčata
křídla křídlo křídly křídel perutě
chvíle chvíli chvílí chvilka chvilku
doba době dobou dobách dob
věky věkům věků věkách věkem
dálně dálná dálné dálný
mámení mámit mámivý mámivá
vzpomínka vzpomínky vzpomínkou vzpomínání usínání probouzení rozjímání
tajemství tajemný tajemná tajemné nekonečno nekonečný nekonečná nekonečné
nebeský nebeská nebeské pozemský pozemská pozemské líbezný líbezná líbezné
opuštěný opuštěná opuštěné zapomenutý zapomenutá zapomenuté
ozvěna ozvěny ozvěnou pastýři poutníci rybáři mlynáři
koruna koruny korunou pavučina pavučiny pavučinou
okamžik okamžiky okamžení naposledy uprostřed
večernice jitřenka zornice hvězdičky hvězdičkou
muzika muzikanti veselice kolovrátek kolovrátku
domovina domoviny domovem otčina otčině
kolébavka ukolébavka kolébala kolébali
rozmarýna rozmarýnu levandule heřmánek heřmánku
pohádka pohádky pohádkou jablíčko jablíčka zrcadlo zrcadla
ovečky ovečka kravička koníček koníčka kočička
zamyšlený zamyšlená zamyšlené zadumaný zadumaná zadumané
umlklý umlklá umlklé zmizelý zmizelá zmizelé
zahrádkami zahradami zástupy zástupem
rozvířená rozvířený rozvířené vyhaslý vyhaslá vyhaslé
putování putovat putoval putovala
naslouchání naslouchala naslouchali naslouchají
usmívá usmívala usmívali úsměvem úsměvy
poděkování poděkovat poděkoval
oživení oživena oživený
zapadá zapadalo zapadající západem
rozbouřený rozbouřená rozbouřené rozbouřenou
kolotoče korouhvička korouhvičky
svatozáře svatozář svatozáří
tajuplný tajuplná tajuplné tajuplnou
beznadějí beznaděje beznadějný
nezapomeň nezapomenu nezapomene
dobrodiní milosrdí milosrdný milosrdná
";
